#include <iostream>

#include <wdsat/cli.hpp>

int main(int argc, char** argv) { return wdsat::cli::run(argc, argv, std::cout, std::cerr, std::cin); }
