#include "netcp/cli.hpp"

int main(int argc, char** argv) { return netcp::cli::run(argc, argv); }
