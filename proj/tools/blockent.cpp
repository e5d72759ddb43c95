#include <iostream>

#include <blockent/cli.hpp>

int main(int argc, char** argv) { return blockent::cli::run_cli(argc, argv, std::cout, std::cerr); }
