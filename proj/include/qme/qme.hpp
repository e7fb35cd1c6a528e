#ifndef QME_QME_HPP
#define QME_QME_HPP

#include "qme/bench.hpp"
#include "qme/bernoulli.hpp"
#include "qme/errors.hpp"
#include "qme/lu.hpp"
#include "qme/matrix.hpp"
#include "qme/mmatrix.hpp"
#include "qme/problem.hpp"
#include "qme/problem_io.hpp"
#include "qme/report.hpp"
#include "qme/report_io.hpp"
#include "qme/sda.hpp"

#endif  // QME_QME_HPP
