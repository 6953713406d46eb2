#include "robrsvd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return robrsvd::cli::run(argc, argv, std::cout, std::cerr); }
