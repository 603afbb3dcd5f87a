#include "ewgame/cli.hpp"

int main(int argc, char** argv) { return ewgame::cli_main(argc, argv); }
