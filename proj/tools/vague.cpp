#include "vague/cli.hpp"

int main(int argc, char** argv) { return vague::cli::run(argc, argv); }
