#include "porstore/cost.hpp"

#include "porstore/error.hpp"

namespace porstore {

void CostModel::validate() const {
    if (fetch_remote_cost <= block_read_cost)
        throw Error(ErrorCode::ConfigError, "fetch_remote_cost must exceed block_read_cost");
}

}  // namespace porstore
