#include "salemlab/cli.hpp"

int main(int argc, char** argv) { return salemlab::cli::dispatch(argc, argv); }
