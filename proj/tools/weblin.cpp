#include <iostream>
int main() { std::cout << "weblin: not wired up yet\n"; return 1; }
