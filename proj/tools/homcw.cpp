#include "homcw/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return homcw::run(argc, argv, std::cout, std::cerr); }
