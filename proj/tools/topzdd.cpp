#include <iostream>

#include "topzdd/cli.hpp"

int main(int argc, char** argv) { return topzdd::cli::run(argc, argv, std::cout, std::cerr); }
