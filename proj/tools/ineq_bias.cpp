#include <iostream>

#include "ineq_bias_app.hpp"

int main(int argc, char** argv) { return ineqbias::cli::run(argc, argv, std::cout, std::cerr); }
