#include "chainspill/cli.hpp"

int main(int argc, char** argv) { return chainspill::cli::dispatch(argc, argv); }
