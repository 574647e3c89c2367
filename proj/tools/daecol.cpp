#include <daecol/cli.hpp>

int main(int argc, char** argv) { return daecol::cli::run(argc, argv); }
