#include <iostream>
#include <string>
#include <vector>

#include "tsf/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tsf::cli::run(args, std::cout, std::cerr);
}
