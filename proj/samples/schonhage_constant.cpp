// samples/schonhage_constant.cpp: enclosures of C_s at increasing precision.

#include "chainlab/schonhage_constant.hpp"

#include <iostream>

int main() {
    for (unsigned bits : {32u, 64u, 128u}) {
        const chainlab::CsEnclosure cs = chainlab::compute_cs(bits);
        std::cout << bits << " bits: [" << cs.lower << ", " << cs.upper << "]  width " << cs.width
                  << (cs.within_bound ? "  (<= 2.13)" : "") << '\n';
    }
}
