// samples/defect_catalog.cpp: the defect values below a threshold, with stability.
//
//   sample_defect_catalog [r] [n_max]

#include "chainlab/chainlab.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace chainlab;
    const Threshold r = Threshold::parse(argc > 1 ? argv[1] : "1.5");
    const Natural n_max = parse_natural(argc > 2 ? argv[2] : "1024");

    LengthCache cache;
    SearchContext ctx;
    ctx.cache = &cache;
    const Catalog catalog = enumerate_defects(r, n_max, ctx);

    std::cout << "defect values <= " << r.str() << " over n <= " << n_max << '\n';
    for (const auto& e : catalog.entries) {
        std::cout << "  " << to_decimal(e.defect) << "  leader " << e.leader << "  (" << e.multiplicity << " n, "
                  << (e.stability ? to_string(*e.stability) : "unprobed") << ")\n";
    }
    std::cout << catalog.certificate.note << '\n';

    std::cout << "\nfirst values of S_3:\n";
    for (const auto& v : sk_prefix(3, 6)) {
        std::cout << "  " << to_decimal(v) << '\n';
    }
    const DropScan drop = smallest_drop(n_max, ctx);
    if (drop.drop) {
        std::cout << "\nsmallest n <= " << n_max << " with l(2n) = l(n): " << drop.drop->n << '\n'
                  << "  " << to_string(drop.drop->chain_n) << '\n'
                  << "  " << to_string(drop.drop->chain_2n) << '\n';
    }
}
