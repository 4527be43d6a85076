#pragma once

#include <stdexcept>
#include <string>

namespace replan
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define REPLAN_DEFINE_ERROR(Name)   \
  class Name : public Error         \
  {                                 \
  public:                           \
    using Error::Error;             \
  }

// gridmap
REPLAN_DEFINE_ERROR(PoseOutOfBounds);
REPLAN_DEFINE_ERROR(MalformedHeader);
REPLAN_DEFINE_ERROR(DimensionMismatch);
REPLAN_DEFINE_ERROR(InvalidArgument);
// lattice
REPLAN_DEFINE_ERROR(UnsupportedHeadingCount);
REPLAN_DEFINE_ERROR(DegenerateBase);
REPLAN_DEFINE_ERROR(EmptyTrajectory);
// metrics
REPLAN_DEFINE_ERROR(EmptySet);
// arbiter
REPLAN_DEFINE_ERROR(PlanningFailed);

#undef REPLAN_DEFINE_ERROR

}  // namespace replan
