#include "cli.hpp"

int main(int argc, char** argv) { return fou::cli::dispatch(argc, argv); }
