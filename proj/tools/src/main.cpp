#include <iostream>

#include "hgamma/tools/commands.hpp"

int main(int argc, char** argv) { return hgamma::tools::dispatch(argc, argv, std::cout, std::cerr); }
