#include "pa/boxes.hpp"

namespace pa {

template class BoxElement<QScalar>;
template class BoxElement<double>;

}  // namespace pa
