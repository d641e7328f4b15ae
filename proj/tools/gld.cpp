#include <iostream>

#include "gld/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return gld::cli::run(args, std::cout, std::cerr);
}
