#include "xyness/cli.hpp"

int main(int argc, char** argv) { return xyness::cli::run(argc, argv); }
