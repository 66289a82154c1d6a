"""Configuration schemas: the application config (SCConfigManager) and per-run configs (cerberus)."""

COMMANDS = ["integrals", "pick", "symbol", "verify-symbol", "gram", "positivity", "classify", "example-t", "simulate"]

TOLERANCE_DEFAULTS = {
    "rel_tol": 1e-10,
    "abs_tol": 1e-12,
    "integrals": 1e-8,
    "symmetry": 1e-9,
    "bound_slack": 1e-8,
    "closed_form": 1e-7,
    "unitarity": 1e-10,
    "verify": 1e-6,
    "gram": 1e-9,
    "classify": 1e-8,
    "complex_structure": 1e-9,
    "witness": 1e-9,
    "exact": 1e-12,
    "reflection": 1e-6,
    "decay": 1e-6,
}


class ConfigSchema:
    """Application settings read from config.yaml."""

    def __init__(self):
        self.default = {
            "Files": {
                "LogfileName": "logfile.log",
                "LogfileMaxLines": 500,
                "LogProcessID": False,
                "LogfileVerbosity": "summary",
                "ConsoleVerbosity": "summary",
            },
            "Numerics": {
                "RelTol": 1e-10,
                "AbsTol": 1e-12,
                "MaxRefinements": 4000,
                "HalflineMap": "split_inverse",
            },
            "Reports": {
                "IncludeTiming": False,
            },
        }

        self.placeholders = {}

        self.validation = {
            "Files": {
                "type": "dict",
                "schema": {
                    "LogfileName": {"type": "string", "required": False, "nullable": True},
                    "LogfileMaxLines": {"type": "number", "required": False, "nullable": True, "min": 0, "max": 100000},
                    "LogProcessID": {"type": "boolean", "required": False, "nullable": True},
                    "LogfileVerbosity": {"type": "string", "required": True, "allowed": ["none", "error", "warning", "summary", "detailed", "debug", "all"]},
                    "ConsoleVerbosity": {"type": "string", "required": True, "allowed": ["error", "warning", "summary", "detailed", "debug"]},
                },
            },
            "Numerics": {
                "type": "dict",
                "required": False,
                "nullable": True,
                "schema": {
                    "RelTol": {"type": "number", "required": False, "nullable": True, "min": 1e-15, "max": 1e-2},
                    "AbsTol": {"type": "number", "required": False, "nullable": True, "min": 1e-18, "max": 1e-2},
                    "MaxRefinements": {"type": "integer", "required": False, "nullable": True, "min": 1, "max": 1000000},
                    "HalflineMap": {"type": "string", "required": False, "nullable": True, "allowed": ["split_inverse", "rational"]},
                },
            },
            "Reports": {
                "type": "dict",
                "required": False,
                "nullable": True,
                "schema": {
                    "IncludeTiming": {"type": "boolean", "required": False, "nullable": True},
                },
            },
        }


_MATRIX = {"type": "list", "nullable": True, "schema": {"type": "list", "schema": {"type": "number"}}}
_RANGE = {
    "type": "dict",
    "schema": {
        "lo": {"type": "number"},
        "hi": {"type": "number"},
        "n": {"type": "integer", "min": 1, "max": 100000},
    },
}


class RunConfigSchema:
    """Schema and defaults of a single run configuration (JSON or YAML)."""

    def __init__(self):
        self.default = {
            "seed": 0,
            "measure": None,
            "symbol": None,
            "projection": None,
            "C": None,
            "t": None,
            "alpha": 1.0,
            "grids": {
                "x_grid": {"lo": 1e-3, "hi": 1e3, "n": 12},
                "positivity_grid": {"lo": 1e-3, "hi": 1e3, "n": 64},
                "gram": {"n_axis": 4, "generic": True},
                "samples": 12,
                "simulator": {
                    "n": 4096,
                    "x_max": 64.0,
                    "t_list": [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0],
                    "trials": 200,
                    "sweep": [[2048, 32.0], [4096, 64.0], [8192, 128.0]],
                },
            },
            "tolerances": {},
        }

        self.validation = {
            "command": {"type": "string", "required": True, "allowed": COMMANDS},
            "seed": {"type": "integer", "min": 0, "max": 2**64 - 1},
            "measure": {
                "type": "dict",
                "nullable": True,
                "schema": {
                    "dim": {"type": "integer", "required": True, "min": 1, "max": 16},
                    "density": {
                        "type": "dict",
                        "nullable": True,
                        "schema": {
                            "name": {"type": "string", "required": True},
                            "params": {"type": "list", "schema": {"type": "number"}},
                        },
                    },
                    "atoms": {
                        "type": "list",
                        "schema": {
                            "type": "dict",
                            "schema": {
                                "lambda": {"type": "number", "required": True},
                                "weight_re": {**_MATRIX, "required": True, "nullable": False},
                                "weight_im": _MATRIX,
                            },
                        },
                    },
                },
            },
            "symbol": {
                "type": "dict",
                "nullable": True,
                "schema": {
                    "name": {"type": "string", "required": True, "allowed": ["i_sgn", "example_beta_closed", "beta", "i_imag"]},
                    "params": {"type": "list", "schema": {"type": "number"}},
                    "dim": {"type": "integer", "min": 1, "max": 16},
                },
            },
            "projection": _MATRIX,
            "C": _MATRIX,
            "t": {"type": "number", "nullable": True, "min": 0.0, "max": 1.0},
            "alpha": {"type": "number", "min": 0.0},
            "grids": {
                "type": "dict",
                "schema": {
                    "x_grid": _RANGE,
                    "positivity_grid": _RANGE,
                    "gram": {
                        "type": "dict",
                        "schema": {
                            "n_axis": {"type": "integer", "min": 1, "max": 64},
                            "generic": {"type": "boolean"},
                        },
                    },
                    "samples": {"type": "integer", "min": 1, "max": 1000},
                    "simulator": {
                        "type": "dict",
                        "schema": {
                            "n": {"type": "integer", "min": 2},
                            "x_max": {"type": "number", "min": 0.0},
                            "t_list": {"type": "list", "schema": {"type": "number"}},
                            "trials": {"type": "integer", "min": 1, "max": 100000},
                            "sweep": {"type": "list", "schema": {"type": "list", "items": [{"type": "integer"}, {"type": "number"}]}},
                        },
                    },
                },
            },
            "tolerances": {
                "type": "dict",
                "keysrules": {"type": "string", "allowed": list(TOLERANCE_DEFAULTS)},
                "valuesrules": {"type": "number", "min": 0.0},
            },
        }
