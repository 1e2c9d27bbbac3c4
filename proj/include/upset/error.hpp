#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace upset {

enum class Errc {
    // input format
    ParseError,
    // domain validation
    OddsOutOfRange,
    FavoriteNotMinimum,
    SameTeams,
    InvalidScore,
    InvalidConfig,
    MissingTags,
    DuplicateTweetId,
    // operation preconditions
    MissingOutcome,
    EmptyList,
    EmptyInput,
    EmptySample,
    EmptyCorpus,
    MissingPrecomputedScore,
    CorpusNotFiltered,
    UnlabeledGame,
    MissingClass,
    DimensionMismatch,
    KTooLarge,
    LengthMismatch,
    EmptyAggregate,
    ZeroTotalStake,
    EventOutOfRange,
    OverlappingGroups,
    Io,
};

inline std::string_view errc_name(Errc c) {
    switch (c) {
        case Errc::ParseError: return "ParseError";
        case Errc::OddsOutOfRange: return "OddsOutOfRange";
        case Errc::FavoriteNotMinimum: return "FavoriteNotMinimum";
        case Errc::SameTeams: return "SameTeams";
        case Errc::InvalidScore: return "InvalidScore";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::MissingTags: return "MissingTags";
        case Errc::DuplicateTweetId: return "DuplicateTweetId";
        case Errc::MissingOutcome: return "MissingOutcome";
        case Errc::EmptyList: return "EmptyList";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::EmptySample: return "EmptySample";
        case Errc::EmptyCorpus: return "EmptyCorpus";
        case Errc::MissingPrecomputedScore: return "MissingPrecomputedScore";
        case Errc::CorpusNotFiltered: return "CorpusNotFiltered";
        case Errc::UnlabeledGame: return "UnlabeledGame";
        case Errc::MissingClass: return "MissingClass";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::KTooLarge: return "KTooLarge";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::EmptyAggregate: return "EmptyAggregate";
        case Errc::ZeroTotalStake: return "ZeroTotalStake";
        case Errc::EventOutOfRange: return "EventOutOfRange";
        case Errc::OverlappingGroups: return "OverlappingGroups";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

/// Coarse grouping used by the command line to pick an exit code.
enum class ErrorCategory { Parse, Validation, Runtime };

inline ErrorCategory category_of(Errc c) {
    switch (c) {
        case Errc::ParseError:
            return ErrorCategory::Parse;
        case Errc::OddsOutOfRange:
        case Errc::FavoriteNotMinimum:
        case Errc::SameTeams:
        case Errc::InvalidScore:
        case Errc::InvalidConfig:
        case Errc::MissingTags:
        case Errc::DuplicateTweetId:
            return ErrorCategory::Validation;
        default:
            return ErrorCategory::Runtime;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

    Errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    Errc code_;
    std::string message_;
};

/// Malformed input; carries the 1-based line number of the offending record.
class ParseError : public Error {
public:
    ParseError(std::string_view source, std::size_t line, const std::string& what)
        : Error(Errc::ParseError,
                std::string(source) + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace upset
