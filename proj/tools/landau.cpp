#include "landau/cli.hpp"

int main(int argc, char** argv) { return landau::cli_main(argc, argv); }
