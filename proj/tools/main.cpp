#include "cli_app.hpp"

int main(int argc, char** argv) { return kmedian::cli::run(argc, argv); }
