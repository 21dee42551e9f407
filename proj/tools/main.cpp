#include "commands.hpp"

int main(int argc, char** argv) { return ncw::cli::run(argc, argv); }
