#include <iostream>
#include <string>
#include <vector>

#include "beliefs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return beliefs::run_cli(args, std::cout, std::cerr);
}
