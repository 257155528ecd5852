#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module validates the values read from configuration files and
command line arguments. Every configuration key has an entry in
constants.CONFIG_ERRORS with the message shown to the user and the
checks applied to the value (type, minimum, maximum, path, allowed values).
All failures are collected and reported together before exiting with the
configuration error code.

Code documentation
------------------
"""

import os
import sys
import ast
import configparser

try:
    from HyperfineSPAM.utils import constants as ct
except ModuleNotFoundError:
    from utils import constants as ct


def tryeval(val):
    """
    Evaluates the type of the input.

    Parameters
    ----------
    val : str
        Value read from a file.

    Returns
    -------
    val : any type
        Converted value, or the input string if it is not a literal.
    """
    try:
        val = ast.literal_eval(val)
    except (ValueError, SyntaxError):
        pass

    return val


def check_minimum(value, minimum):
    """Check if a value is not below a threshold value."""

    return value >= minimum


def check_maximum(value, maximum):
    """Check if a value is not above a threshold value."""

    return value <= maximum


def check_value_type(value, expected_type):
    """Convert value to the expected type; None if it is not possible."""

    try:
        if expected_type is bool:
            converted = tryeval(value)
        elif expected_type is int:
            converted = tryeval(value)
            if type(converted) is not int:
                return None
        else:
            converted = expected_type(value)
        if type(converted) is expected_type:
            return converted
        return None
    except (ValueError, TypeError):
        return None


def check_path(value):
    """Check if a path exists."""

    return os.path.exists(value)


def check_in_list(value, expected_values):
    """Check that a value is one of the allowed values."""

    return value in expected_values


def check_parameter(value, validate_type, validate_minimum, validate_maximum,
                    validate_path, validate_list):
    """
    Validate a value passed to a parameter.

    Returns
    -------
    value : any type or None
        Converted value, or None if any check fails.
    """
    if validate_type is not None:
        value = check_value_type(value, validate_type)
        if value is None:
            return None
    if validate_minimum is not None and not check_minimum(value, validate_minimum):
        return None
    if validate_maximum is not None and not check_maximum(value, validate_maximum):
        return None
    if validate_path and not check_path(value):
        return None
    if validate_list is not None and not check_in_list(value, validate_list):
        return None

    return value


def check_config_value(key, value):
    """
    Validate one 'section.key' value.

    Returns
    -------
    value : any type or None
        Converted value (a tuple for list keys), None if invalid.
    """
    checks = ct.CONFIG_ERRORS[key][1]
    if key in ct.NULLABLE_KEYS and value.strip() in ['None', '']:
        return 'None'
    if key in ct.LIST_KEYS:
        items = [check_parameter(v.strip(), *checks) for v in value.split(',')]
        if len(items) == 0 or any(v is None for v in items):
            return None
        return tuple(items)

    return check_parameter(value.strip(), *checks)


def report_and_exit(header, messages):
    """Print a list of messages to stderr and exit with the config error code."""

    print(f"\nError: {header}", file=sys.stderr)
    print('\n'.join(messages), file=sys.stderr)
    sys.exit(ct.EXIT_CONFIG_ERROR)


def validate_config_file(file_path):
    """
    Validates a configuration file.

    Parameters
    ----------
    file_path : str
        Path to an INI file with [run], [prep], [detection], [shelving] and
        [bursts] sections; every key is optional.

    Returns
    -------
    parameter_values : dict
        'section.key' -> converted value. None values are returned as None.
    """
    if not os.path.isfile(file_path):
        report_and_exit("Configuration file not found:", [file_path])

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(file_path, encoding='utf-8')
    except configparser.Error as error:
        report_and_exit("Malformed configuration file:", [str(error)])

    unexpected_sections = [s for s in parser.sections() if s not in ct.CONFIG_SECTIONS]
    if len(unexpected_sections) > 0:
        report_and_exit("Following unexpected sections:", unexpected_sections)

    unexpected_keys = [f"{section}.{key}"
                       for section in parser.sections()
                       for key in parser[section]
                       if key not in ct.CONFIG_SECTIONS[section]]
    if len(unexpected_keys) > 0:
        report_and_exit("Following unexpected keys:", unexpected_keys)

    warnings = []
    parameter_values = {}
    for section in parser.sections():
        for key, value in parser[section].items():
            name = f"{section}.{key}"
            valid = check_config_value(name, value)
            if valid is None:
                warnings.append(ct.CONFIG_ERRORS[name][0])
            else:
                parameter_values[name] = None if valid == 'None' else valid

    if len(warnings) > 0:
        report_and_exit("Invalid configuration values:", warnings)

    return parameter_values


def validate_species_name(name, species_list):
    """Return the species with this name or exit with the config error code."""

    known = [s.name for s in species_list]
    if name not in known:
        report_and_exit(f"Unknown species '{name}'.",
                        [f"Known species: {', '.join(known)}"])

    return species_list[known.index(name)]


def validate_threads(value):
    """argparse type for --threads."""

    threads = check_parameter(value, int, 1, None, None, None)
    if threads is None:
        raise ValueError("threads must be an int greater than 0")

    return threads
