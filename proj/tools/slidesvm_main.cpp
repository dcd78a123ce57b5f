#include <iostream>

#include "slidesvm/cli.hpp"

int main(int argc, char** argv) { return slidesvm::run_cli(argc, argv, std::cout, std::cerr); }
