#include <string>

#include "geoses/catalog.hpp"

namespace geoses {

namespace {
const char* const kCensus2010Json =
#include "embedded_census2010.inc"
    ;
}

const std::string& bundled_catalog_text() {
    static const std::string text(kCensus2010Json);
    return text;
}

}  // namespace geoses
