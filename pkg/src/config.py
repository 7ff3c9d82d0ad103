import json
from dataclasses import dataclass, asdict, fields
from pathlib import Path

FORMATS = ("plain", "latex", "json", "csv")


@dataclass
class Config:
    default_format: str = "plain"
    default_stencil_order: int = 2
    max_exponent: int = 64
    max_coeff_bits: int = 8192
    blowup_threshold: float = 1e6
    dealias: bool = True

    @staticmethod
    def _get_config_path() -> Path:
        """Returns path to ~/.config/gnpwe-cl/config.json"""
        config_dir = Path.home() / ".config" / "gnpwe-cl"
        config_dir.mkdir(parents=True, exist_ok=True)
        return config_dir / "config.json"

    @classmethod
    def load(cls) -> "Config":
        """Loads config from file or returns defaults."""
        try:
            path = cls._get_config_path()
        except OSError:
            return cls()
        if not path.exists():
            return cls()

        try:
            with open(path, "r") as f:
                data = json.load(f)
                # Filter unknown keys to allow adding fields later
                known_keys = cls().__dict__.keys()
                filtered_data = {k: v for k, v in data.items() if k in known_keys}
                return cls(**filtered_data)
        except Exception:
            return cls()  # Fallback to defaults on error

    def save(self):
        """Saves current config to file."""
        path = self._get_config_path()
        with open(path, "w") as f:
            json.dump(asdict(self), f, indent=4)

    def set(self, key: str, value):
        """Updates a config value and persists it."""
        if not hasattr(self, key):
            raise KeyError(f"Unknown config key: {key}")

        kind = {f.name: f.type for f in fields(self)}[key]
        if kind in (bool, "bool"):
            if isinstance(value, str):
                value = value.strip().lower() in ("1", "true", "yes", "on")
            value = bool(value)
        elif kind in (int, "int"):
            value = int(value)
        elif kind in (float, "float"):
            value = float(value)

        if key == "default_format" and value not in FORMATS:
            raise ValueError(f"Unknown format: {value} (choose from {', '.join(FORMATS)})")
        if key == "default_stencil_order" and value not in (2, 4):
            raise ValueError("Stencil order must be 2 or 4")
        if key in ("max_exponent", "max_coeff_bits") and value < 1:
            raise ValueError(f"{key} must be positive")

        setattr(self, key, value)
        self.save()


# Singleton instance
config = Config.load()
