#include "riskgene/cli.hpp"

int main(int argc, char** argv) { return riskgene::cli::run(argc, argv); }
