#include <exception>
#include <iostream>

#include "relexp/cli/commands.hpp"

int main(int argc, char** argv) {
    try {
        return relexp::cli::run(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
