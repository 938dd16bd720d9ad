#include <cstdio>
#include <iostream>

#include "rnm/cli.hpp"

int main(int argc, char** argv) {
    const auto r = rnm::cli::run(std::vector<std::string>(argv + 1, argv + argc));
    std::fwrite(r.payload.data(), 1, r.payload.size(), stdout);
    for (const auto& d : r.diagnostics) std::cerr << "rnm: " << d << '\n';
    return r.exit_code;
}
