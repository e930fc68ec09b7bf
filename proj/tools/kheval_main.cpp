#include <iostream>
#include <string>
#include <vector>

#include "kheval/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return kheval::run_main(args, std::cout, std::cerr);
}
