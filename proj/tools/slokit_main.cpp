#include <cstdio>

int main() {
    std::puts("slokit: CLI under construction");
    return 0;
}
