// samples/shortest_chain.cpp: shortest chains, defects and small steps for a few n.
//
//   sample_shortest_chain [n ...]

#include "chainlab/chainlab.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    using namespace chainlab;
    std::vector<Natural> targets;
    for (int i = 1; i < argc; ++i) {
        targets.push_back(parse_natural(argv[i]));
    }
    if (targets.empty()) {
        targets = {7, 15, 127, 191, 382, 1903};
    }

    LengthCache cache;
    SearchContext ctx;
    ctx.cache = &cache;
    for (const auto& n : targets) {
        const SearchOutcome all = search_and_record(n, ctx);
        const SearchOutcome star = shortest_length(n, ChainClass::star(), ctx.budget);
        std::cout << "n = " << n << "  (nu = " << ones_count(n) << ")\n";
        std::cout << "  l(n)   = " << all.length << "  " << to_string(all.witness)
                  << (all.exact() ? "" : "  [budget exhausted]") << '\n';
        std::cout << "  l*(n)  = " << star.length << "  " << to_string(star.witness) << '\n';
        std::cout << "  binary = " << binary_chain_length(n) << '\n';
        if (all.exact()) {
            const ExactDefect d{all.length, n, "all"};
            std::cout << "  delta  = " << to_decimal(d) << ",  s(n) = " << ceil_defect(d) << ",  bucket "
                      << to_string(classify_small_steps(n).bucket) << '\n';
        }
    }
}
