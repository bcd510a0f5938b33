#include "pseudometric/cli.hpp"

int main(int argc, char** argv) { return pseudometric::cli::run(argc, argv); }
