#include "chainlat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chainlat::cli::dispatch(args, std::cout, std::cerr);
}
