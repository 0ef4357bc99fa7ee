#include "qring/cli.hpp"

int main(int argc, char** argv) { return qring::cli::run(argc, argv); }
