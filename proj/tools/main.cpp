#include "henonlab/cli.hpp"

int main(int argc, char** argv) { return henonlab::cli::dispatch(argc, argv); }
