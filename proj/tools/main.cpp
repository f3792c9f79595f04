#include "credit_curves/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return credit_curves::cli::run(argc, argv, std::cout, std::cerr);
}
