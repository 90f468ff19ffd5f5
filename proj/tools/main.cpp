#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return membrane::cli::dispatch(argc, argv, std::cout, std::cerr); }
