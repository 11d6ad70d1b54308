"""Exception and warning types raised across the toolkit."""


class AsapError(Exception):
    """Base class for all toolkit errors."""


# annotation model

class AnnotationError(AsapError, ValueError):
    pass


class OffsetOutOfBounds(AnnotationError):
    pass


class InvertedSpan(AnnotationError):
    pass


class OverlapNotNestable(AnnotationError):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(
            f"{first.type_name}[{first.start},{first.end}) partially overlaps "
            f"{second.type_name}[{second.start},{second.end})"
        )


class MalformedInput(AsapError):
    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:{column}:"
        super().__init__(f"{where} {message}" if where else message)


# pipeline stages

class AlreadyTokenized(AsapError):
    pass


class MissingTokens(AsapError):
    pass


class IndexNotFound(AsapError, FileNotFoundError):
    pass


class ListNotFound(AsapError, FileNotFoundError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"gazetteer list not found: {name}")


class EmptyListWarning(UserWarning):
    pass


# rule language

class RuleSyntaxError(AsapError):
    def __init__(self, line, col, expected, found=None):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"line {line}, col {col}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnboundLabel(AsapError):
    def __init__(self, rule, label):
        self.rule = rule
        self.label = label
        super().__init__(f"rule {rule!r} uses unbound label {label!r}")


class UnknownControl(AsapError):
    def __init__(self, keyword):
        self.keyword = keyword
        super().__init__(f"unknown control style {keyword!r}")


class MissingInputTypeWarning(UserWarning):
    pass


# structuring

class NoFacetsFound(AsapError):
    pass


class UnmappedLabel(AsapError, KeyError):
    def __init__(self, label):
        self.label = label
        super().__init__(label)

    def __str__(self):
        return f"no facet mapping for label {self.label!r}"


class StructureWarning(UserWarning):
    pass


# evaluation

class MixedTypes(AsapError, ValueError):
    pass


class NonPositiveBeta(AsapError, ValueError):
    pass


# command line

class EmptyCorpus(AsapError):
    pass


class ConfigNotFound(AsapError, FileNotFoundError):
    pass


class MissingResource(AsapError, FileNotFoundError):
    def __init__(self, path):
        self.path = path
        super().__init__(f"missing resource: {path}")
