#include <string>
#include <vector>

#include "whiplash/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return whiplash::cli_main(std::move(args));
}
