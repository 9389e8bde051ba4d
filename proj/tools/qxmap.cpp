#include <vector>

#include "qxmap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qxmap::cli::run_cli(std::move(args));
}
