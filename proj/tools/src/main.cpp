#include <iostream>

#include "slag/cli/app.hpp"

int main(int argc, char** argv) { return slag::cli::main_entry(argc, argv, std::cout, std::cerr); }
