from typing import Dict, Any, List

from services.errors import CloneforgeError
from services.homology import field_characteristic
from services.system_registry import system_from_name
from utils.reports import parse_n_values

MAX_N = 64
MAX_SAMPLES = 100000


class RunConfigValidator:
    """Validate run parameters coming from the CLI or a JSON payload"""

    def __init__(self):
        self.valid_commands = ['nf', 'verify', 'homology', 'mul', 'eq', 'inv', 'reduce', 'stein']
        self.valid_kinds = ['matching', 'dlk']
        self.element_commands = ['mul', 'eq', 'inv', 'reduce']

    def validate(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Validate all run parameters"""
        errors = []

        if not data:
            errors.append("No data provided")
            return {'valid': False, 'errors': errors}

        command = data.get('command')
        if command not in self.valid_commands:
            errors.append(f"Invalid command: {command}")
            return {'valid': False, 'errors': errors}

        errors.extend(self._validate_system(data, command))
        errors.extend(self._validate_sizes(data, command))
        errors.extend(self._validate_general(data))

        return {
            'valid': len(errors) == 0,
            'errors': errors
        }

    def _validate_system(self, data: Dict[str, Any], command: str) -> List[str]:
        errors = []

        system = data.get('system')
        needs_system = command in self.element_commands + ['verify', 'stein'] \
            or (command == 'homology' and data.get('kind') == 'dlk')
        if needs_system and not system:
            errors.append(f"Command {command} needs a system")
        elif system:
            try:
                system_from_name(str(system), data.get('ring'))
            except CloneforgeError as e:
                errors.append(str(e))

        if command in self.element_commands:
            if not data.get('a'):
                errors.append("Element a is required")
            if command in ('mul', 'eq') and not data.get('b'):
                errors.append("Element b is required")

        if command == 'homology':
            kind = data.get('kind')
            if kind not in self.valid_kinds:
                errors.append(f"Invalid complex kind: {kind}")

        return errors

    def _validate_sizes(self, data: Dict[str, Any], command: str) -> List[str]:
        errors = []

        n_max = data.get('n_max')
        if n_max is not None:
            errors.extend(self._bounded_int('n_max', n_max, 1, MAX_N))
        elif command == 'verify':
            errors.append("n_max is required")

        n_values = data.get('n_values')
        if n_values is not None:
            try:
                values = parse_n_values(n_values)
                if any(n < 1 or n > MAX_N for n in values):
                    errors.append(f"n values must be between 1 and {MAX_N}")
            except ValueError as e:
                errors.append(str(e))
        elif command == 'homology':
            errors.append("n_values is required")

        feet_max = data.get('feet_max')
        if feet_max is not None:
            errors.extend(self._bounded_int('feet_max', feet_max, 1, MAX_N))

        samples = data.get('samples')
        if samples is not None:
            errors.extend(self._bounded_int('samples', samples, 1, MAX_SAMPLES))

        budget = data.get('budget')
        if budget is not None:
            errors.extend(self._bounded_int('budget', budget, 1, None))

        return errors

    def _validate_general(self, data: Dict[str, Any]) -> List[str]:
        errors = []

        seed = data.get('seed')
        if seed is not None:
            try:
                value = int(seed)
                if value < 0 or value >= 2 ** 64:
                    errors.append("Seed must be a 64-bit unsigned integer")
            except (ValueError, TypeError):
                errors.append("Seed must be a valid integer")

        field = data.get('field')
        if field:
            try:
                field_characteristic(str(field))
            except (CloneforgeError, ValueError) as e:
                errors.append(f"Invalid field {field}: {e}")

        return errors

    @staticmethod
    def _bounded_int(name: str, value: Any, low: int, high) -> List[str]:
        try:
            value = int(value)
        except (ValueError, TypeError):
            return [f"{name} must be a valid number"]
        if value < low or (high is not None and value > high):
            bound = f"between {low} and {high}" if high is not None else f"at least {low}"
            return [f"{name} must be {bound}"]
        return []
