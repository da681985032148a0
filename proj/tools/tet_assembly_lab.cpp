#include "tal/harness.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    tal::CliHooks hooks;
#ifdef TAL_FAULT_INJECTION
    // Test fixture: corrupt one RSP entry so verification must fail.
    hooks.perturb = [](tal::VariantId id, tal::GlobalRhs& rhs) {
        if (id == tal::VariantId::RSP && rhs.size() > 0)
            rhs.values[rhs.size() / 2][0] += 1.0;
    };
#endif
    return tal::run_cli({argv + 1, argv + argc}, std::cout, std::cerr, hooks);
}
