// samples/ordinals.cpp: natural sums and the order-type bounds for defects up to q.

#include "chainlab/ordinal.hpp"

#include <iostream>

int main() {
    using namespace chainlab;
    const OrdinalCNF x = parse_cnf("w^2*3+w+4");
    const OrdinalCNF y = parse_cnf("w^3+w*2");
    std::cout << format_cnf(x) << " (+) " << format_cnf(y) << " = " << format_cnf(natural_sum(x, y)) << '\n';

    for (unsigned q = 1; q <= 6; ++q) {
        const Rwo1Bound b = rwo1_bound(q);
        std::cout << "q = " << q << ": " << format_cnf(b.bound) << "  <  " << format_cnf(b.first_upper) << "  <  "
                  << format_cnf(b.second_upper) << '\n';
    }
}
