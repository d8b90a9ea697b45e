#include <iostream>

#include "experiments.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rbit::tools::run_cli(args, std::cout, std::cerr);
}
