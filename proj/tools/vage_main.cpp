#include <iostream>

#include "vage/cli.hpp"

int main(int argc, char** argv) { return vage::cli::run(argc, argv, std::cout, std::cerr); }
