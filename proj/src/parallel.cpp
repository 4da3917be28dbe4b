#include "betsim/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace betsim {

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace betsim
