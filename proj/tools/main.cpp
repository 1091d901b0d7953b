#include <string>
#include <vector>

#include "preslab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return preslab::cli::run(args);
}
