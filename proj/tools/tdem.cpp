#include "tdem/cli.hpp"

int main(int argc, char** argv) { return tdem::cli::dispatch(argc, argv); }
