#include "bayesdl/cli/run.hpp"

int main(int argc, char** argv) { return bayesdl::cli::run(argc, argv); }
