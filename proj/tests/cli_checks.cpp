#include <iostream>
int main() { return 1; }
