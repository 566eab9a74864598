#include <iostream>

#include "klreg/selftest.hpp"

int main() {
    bool ok = klreg::selftest::run_all(std::cout);
    return ok ? 0 : 1;
}
