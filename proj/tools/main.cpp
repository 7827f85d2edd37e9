#include <iostream>

#include "qfcli.hpp"

int main(int argc, char** argv) { return qfcli::run(argc, argv, std::cout, std::cerr); }
