#include <cstdio>
int main() { std::puts("caplift: placeholder"); return 0; }
