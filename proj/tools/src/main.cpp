#include "shockcontract/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return shockcontract::cli::dispatch(argc, argv, std::cout, std::cerr); }
