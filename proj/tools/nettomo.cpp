#include <iostream>
#include <string>
#include <vector>

#include "nettomo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nettomo::run_cli(args, std::cout, std::cerr);
}
