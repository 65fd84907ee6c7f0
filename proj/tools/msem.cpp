#include <iostream>

#include "mimetic/io_cli.hpp"

int main(int argc, char** argv) { return mimetic::run_main(argc, argv, std::cout, std::cerr); }
