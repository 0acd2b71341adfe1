// SPDX-License-Identifier: Apache-2.0
//
// satlink: MIMO land-mobile satellite link simulation library
// Copyright (C) 2026 The satlink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SATLINK_ERRORS_HPP
#define SATLINK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace satlink
{
    // Invalid arguments. Every library error derives from one of the two std bases,
    // so callers that only care about "bad input" vs "failed at runtime" can catch those.

    class DomainError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class InvalidParams : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class DimensionMismatch : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class SpacingTooLarge : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class EmptyInput : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class IndexError : public std::out_of_range
    {
    public:
        using std::out_of_range::out_of_range;
    };

    class InsufficientBits : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Runtime failures

    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class SingularChannel : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Scenario file errors

    class ParseError : public std::runtime_error
    {
    public:
        ParseError(std::size_t line, std::size_t column, const std::string &message)
            : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
              line_(line), column_(column)
        {
        }

        std::size_t line() const noexcept { return line_; }
        std::size_t column() const noexcept { return column_; }

    private:
        std::size_t line_;
        std::size_t column_;
    };

    class ValidationError : public std::invalid_argument
    {
    public:
        ValidationError(const std::string &field, const std::string &message)
            : std::invalid_argument(field + ": " + message), field_(field)
        {
        }

        const std::string &field() const noexcept { return field_; }

    private:
        std::string field_;
    };
}

#endif
