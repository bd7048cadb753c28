#pragma once

#include <stdexcept>
#include <string>

namespace statechat {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingPlaceholderValue : public Error {
public:
    explicit MissingPlaceholderValue(std::string key)
        : Error("no storage value for placeholder {" + key + "}"), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// A placeholder filter was applied to a value of the wrong shape.
class InvalidPlaceholderValue : public Error {
public:
    InvalidPlaceholderValue(std::string key, const std::string& why)
        : Error("storage value for placeholder {" + key + "} " + why), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Anything that went wrong while talking to the language model.
class LmFailure : public Error {
public:
    using Error::Error;
};

// The scripted backend had no entry for a request.
class ScriptMiss : public LmFailure {
public:
    using LmFailure::LmFailure;
};

class NotAStarterState : public Error {
public:
    explicit NotAStarterState(const std::string& state)
        : Error("state '" + state + "' does not start the conversation") {}
};

class InteractionEnded : public Error {
public:
    InteractionEnded() : Error("interaction has ended") {}
};

class InteractionNotStarted : public Error {
public:
    InteractionNotStarted() : Error("interaction must be started before responding") {}
};

class InteractionAlreadyStarted : public Error {
public:
    InteractionAlreadyStarted() : Error("interaction has already been started") {}
};

class CycleLimitExceeded : public Error {
public:
    explicit CycleLimitExceeded(int cap)
        : Error("more than " + std::to_string(cap) + " automatic transitions in one turn") {}
};

class UnparsableDecision : public Error {
public:
    explicit UnparsableDecision(const std::string& completion)
        : Error("decision completion is neither YES nor NO: '" + completion + "'") {}
};

class UnknownPredicate : public Error {
public:
    explicit UnknownPredicate(const std::string& id) : Error("unknown predicate '" + id + "'") {}
};

class UnknownEffect : public Error {
public:
    explicit UnknownEffect(const std::string& id) : Error("unknown effect '" + id + "'") {}
};

class UnresolvedTarget : public Error {
public:
    explicit UnresolvedTarget(const std::string& target)
        : Error("transition target '" + target + "' does not resolve") {}
};

class NoHistoryRecorded : public Error {
public:
    explicit NoHistoryRecorded(const std::string& outer)
        : Error("history of '" + outer + "' entered before it was ever active") {}
};

} // namespace statechat
