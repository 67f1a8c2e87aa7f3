#include <iostream>

#include "ksil/cli.hpp"

int main(int argc, char** argv) {
    return ksil::cli_main(argc, argv, std::cout, std::cerr);
}
