#include "momentbounds/hankel.hpp"

namespace momentbounds {

template PositivityReport<double> check_positivity<double>(const Matrix<double>&,
                                                           std::optional<double>);
template PositivityReport<HighPrecision>
check_positivity<HighPrecision>(const Matrix<HighPrecision>&, std::optional<HighPrecision>);
template PositivityReport<double> check_positivity_scaled<double>(const Matrix<double>&,
                                                                  const double&);
template PositivityReport<HighPrecision>
check_positivity_scaled<HighPrecision>(const Matrix<HighPrecision>&, const HighPrecision&);

} // namespace momentbounds
