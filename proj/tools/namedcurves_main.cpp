#include "namedcurves/cli.hpp"

int main(int argc, char** argv) { return namedcurves::cli::run(argc, argv); }
