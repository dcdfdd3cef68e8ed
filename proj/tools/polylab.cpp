// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "polylab/cli.hpp"

int main(int argc, char** argv) { return polylab::run_cli(argc, argv, std::cout, std::cerr); }
