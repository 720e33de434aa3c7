#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seizurewave {

/// Base class for all errors raised by this library. `name()` is stable and
/// machine-readable; the CLI maps it into its JSON error output.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual std::string_view name() const { return "Error"; }
};

#define SEIZUREWAVE_DEFINE_ERROR(NAME)                                     \
    class NAME : public Error {                                            \
    public:                                                                \
        explicit NAME(const std::string& msg) : Error(msg) {}              \
        std::string_view name() const override { return #NAME; }           \
    }

// ingest
SEIZUREWAVE_DEFINE_ERROR(TruncatedHeader);
SEIZUREWAVE_DEFINE_ERROR(BadMagic);
SEIZUREWAVE_DEFINE_ERROR(RecordCountMismatch);
SEIZUREWAVE_DEFINE_ERROR(NonUniformRate);
SEIZUREWAVE_DEFINE_ERROR(RaggedRow);
SEIZUREWAVE_DEFINE_ERROR(NonNumericCell);
SEIZUREWAVE_DEFINE_ERROR(EpochTooLong);
SEIZUREWAVE_DEFINE_ERROR(BadAnnotation);

// wavelet
SEIZUREWAVE_DEFINE_ERROR(EmptySignal);
SEIZUREWAVE_DEFINE_ERROR(NonPositiveLevels);
SEIZUREWAVE_DEFINE_ERROR(LengthMismatch);
SEIZUREWAVE_DEFINE_ERROR(LevelOutOfRange);
SEIZUREWAVE_DEFINE_ERROR(UnknownFilter);

// wstats
SEIZUREWAVE_DEFINE_ERROR(ShapeMismatch);
SEIZUREWAVE_DEFINE_ERROR(ZeroVariance);

// graph
SEIZUREWAVE_DEFINE_ERROR(BadThreshold);
SEIZUREWAVE_DEFINE_ERROR(TooFewNodes);

// features
SEIZUREWAVE_DEFINE_ERROR(EmptyInput);

// classify
SEIZUREWAVE_DEFINE_ERROR(EmptyTrainingSet);
SEIZUREWAVE_DEFINE_ERROR(SchemaMismatch);
SEIZUREWAVE_DEFINE_ERROR(VersionMismatch);
SEIZUREWAVE_DEFINE_ERROR(CorruptModel);

// eval
SEIZUREWAVE_DEFINE_ERROR(EmptyList);
SEIZUREWAVE_DEFINE_ERROR(SingleSubject);

// cli/config
SEIZUREWAVE_DEFINE_ERROR(BadConfig);
SEIZUREWAVE_DEFINE_ERROR(IoError);

#undef SEIZUREWAVE_DEFINE_ERROR

}  // namespace seizurewave
