#include "jetvar/cli.hpp"

int main(int argc, char** argv) {
    return jetvar::cli::run(argc, argv, std::cout, std::cerr);
}
