#include <iostream>

#include "nmgab/cli.hpp"

int main(int argc, char** argv) {
    return nmgab::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
