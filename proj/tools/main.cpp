#include "fafchain/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return fafchain::cli::run(argc, argv, std::cout, std::cerr);
}
