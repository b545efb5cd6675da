// tools/chainlab.cpp: command-line entry point.

#include "cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return chainlab::cli::run(argc, argv, std::cout, std::cerr);
}
