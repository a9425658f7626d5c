#include "nanocool/cli.hpp"

int main(int argc, char** argv) {
    return nanocool::cli::main_entry(argc, argv);
}
