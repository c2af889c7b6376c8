#include "commands.hpp"

int main(int argc, char** argv) { return ttqi::cli::run(argc, argv); }
