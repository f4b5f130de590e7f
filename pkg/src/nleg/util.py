import csv
import hashlib
import json
import math

import numpy

FLOAT_FORMAT = '%.17g'

def load_json_with_comments(path):
    contents = []
    with open(path, 'r') as file:
        for line in file:
            line = line.strip()
            if (line == '' or line.startswith('#') or line.startswith('//')):
                continue

            if ('/*' in line):
                raise ValueError("Multi-line comments ('/* ... */') not allowed.")

            contents.append(line)

    return json.loads(' '.join(contents))

def format_value(value):
    """
    Floats get 17 significant digits (exact round trip for 64-bit floats), absent values an empty field.
    """

    if (value is None):
        return ''

    if (isinstance(value, (bool, numpy.bool_))):
        return str(bool(value)).lower()

    if (isinstance(value, (int, numpy.integer))):
        return str(int(value))

    if (isinstance(value, (float, numpy.floating))):
        return FLOAT_FORMAT % (float(value))

    return str(value)

def write_csv(path, header, rows):
    with open(path, 'w', newline = '') as file:
        writer = csv.writer(file, lineterminator = "\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])

def to_json_ready(value):
    if (isinstance(value, dict)):
        return {str(key): to_json_ready(item) for (key, item) in value.items()}

    if (isinstance(value, (list, tuple))):
        return [to_json_ready(item) for item in value]

    if (isinstance(value, numpy.ndarray)):
        return to_json_ready(value.tolist())

    if (isinstance(value, (bool, numpy.bool_))):
        return bool(value)

    if (isinstance(value, (int, numpy.integer))):
        return int(value)

    if (isinstance(value, (float, numpy.floating))):
        value = float(value)
        if (not math.isfinite(value)):
            return None
        return value

    return value

def write_json(path, data):
    with open(path, 'w') as file:
        json.dump(to_json_ready(data), file, indent = 4, sort_keys = True)
        file.write("\n")

def file_digest(path):
    digest = hashlib.sha256()

    with open(path, 'rb') as file:
        for block in iter(lambda: file.read(65536), b''):
            digest.update(block)

    return digest.hexdigest()
