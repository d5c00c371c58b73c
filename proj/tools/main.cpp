#include <iostream>

#include "pptcanon/cli.hpp"

int main(int argc, char** argv) { return pptcanon::cli::run(argc, argv, std::cout, std::cerr); }
