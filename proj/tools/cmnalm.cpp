#include "cmnalm/cli.hpp"

int main(int argc, char** argv) { return cmnalm::cli::run(argc, argv); }
