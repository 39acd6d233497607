#include "namedcurves/error.hpp"

namespace namedcurves {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFileNotFound: return "FileNotFound";
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kBadMagic: return "BadMagic";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNonNormalizedBin: return "NonNormalizedBin";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kDegenerateIncrements: return "DegenerateIncrements";
    case ErrorKind::kBadResolution: return "BadResolution";
    case ErrorKind::kImageTooSmall: return "ImageTooSmall";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kMalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

}  // namespace namedcurves
