#include <iostream>

#include "subconv/cli.hpp"

int main(int argc, char** argv) {
    return subconv::run_cli(argc, argv, std::cout, std::cerr);
}
