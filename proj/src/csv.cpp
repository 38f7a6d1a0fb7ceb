#include "qng/csv.hpp"

#include <locale>
#include <sstream>

namespace qng {

std::string format_real(Real x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace qng
