""" Parse polynomial expressions into DiffPolynomials

    Grammar (precedence ^ > * > unary minus > binary +/-):

        <EXPR>   -> <UNARY> { ( + | - ) <UNARY> }
        <UNARY>  -> - <UNARY> | <TERM>
        <TERM>   -> <POWER> { * <POWER> }
        <POWER>  -> <ATOM> [ ^ [ - ] <INTEGER> ]
        <ATOM>   -> <RATIONAL> | <INTEGER> | <IDENT> | ( <EXPR> )

    Identifiers: t, x, a, b, y<j>, f<k> (f^(k), f0 = f), u, u_<dirs> (dirs from t, x, y<j>,
    y-indices read greedily), and function symbols chi, phi0, phi1, eta0, eta1, xi0, xi1, g
    with optional derivative suffixes (chi_tx). Negative exponents are accepted on b only.
"""
import re
from fractions import Fraction

from src.errors import ExprParseError, JetDomainError
from src.jet.polynomial import FUNCTION_DEPENDENCIES, DiffPolynomial, index_from_suffix


class Lexer:
    """ Expression Lexer

        Tokenizes a sentence into (kind, lexeme, position) triples.
    """

    regex = re.compile('|'.join(['(?P<%s>%s)' % pattern for pattern in
        [ ('RATIONAL',    r'[0-9]+/[0-9]+'),
          ('INTEGER',     r'[0-9]+'),
          ('IDENT',       r'[A-Za-z][A-Za-z0-9_]*'),
          ('PLUS',        r'\+'),
          ('MINUS',       r'-|−'),
          ('STAR',        r'\*'),
          ('CARET',       r'\^'),
          ('LEFT_PAREN',  r'\('),
          ('RIGHT_PAREN', r'\)'),
          ('SPACE',       r'\s+') ]]))

    def tokenize(self, sentence: str) -> list[tuple[str, str, int]]:
        tokens = []
        index = 0
        while index < len(sentence):
            match = self.regex.match(sentence, index)
            if match is None:
                raise ExprParseError(f"unexpected {sentence[index]!r}", sentence, index)
            if match.lastgroup != 'SPACE':
                tokens.append((match.lastgroup, match.group(), index))
            index = match.end()
        tokens.append(('END', '', len(sentence)))
        return tokens


class Parser:
    """ Recursive-descent parser for one dimension n """

    def __init__(self, n: int):
        self.n = n
        self.lexer = Lexer()

    def parse(self, sentence: str) -> DiffPolynomial:
        self.sentence = sentence
        self.tokens = self.lexer.tokenize(sentence)
        self.pos = 0
        if self._peek('END'):
            raise ExprParseError("empty expression", sentence, 0)
        expr = self._expr()
        if not self._peek('END'):
            kind, lexeme, position = self.tokens[self.pos]
            raise ExprParseError(f"unexpected {lexeme!r}", sentence, position)
        return expr

    # ---- token helpers ----

    def _peek(self, kind: str) -> bool:
        return self.tokens[self.pos][0] == kind

    def _accept(self, kind: str):
        if self._peek(kind):
            token = self.tokens[self.pos]
            self.pos += 1
            return token
        return None

    def _expect(self, kind: str, what: str):
        token = self._accept(kind)
        if token is None:
            _, lexeme, position = self.tokens[self.pos]
            found = repr(lexeme) if lexeme else "end of input"
            raise ExprParseError(f"expected {what}, found {found}", self.sentence, position)
        return token

    # ---- grammar ----

    def _expr(self) -> DiffPolynomial:
        result = self._unary()
        while self._peek('PLUS') or self._peek('MINUS'):
            operator = self.tokens[self.pos][0]
            self.pos += 1
            rhs = self._unary()
            result = result + rhs if operator == 'PLUS' else result - rhs
        return result

    def _unary(self) -> DiffPolynomial:
        if self._accept('MINUS'):
            return -self._unary()
        return self._term()

    def _term(self) -> DiffPolynomial:
        result = self._power()
        while self._accept('STAR'):
            result = result * self._power()
        return result

    def _power(self) -> DiffPolynomial:
        start = self.tokens[self.pos][2]
        base = self._atom()
        if not self._accept('CARET'):
            return base
        negative = self._accept('MINUS') is not None
        _, lexeme, position = self._expect('INTEGER', "integer exponent")
        exponent = -int(lexeme) if negative else int(lexeme)
        if exponent >= 0:
            return base**exponent
        if base == DiffPolynomial.param("b"):
            return DiffPolynomial.param("b", exponent)
        raise ExprParseError("negative exponents are only allowed on b", self.sentence, start)

    def _atom(self) -> DiffPolynomial:
        token = self._accept('RATIONAL')
        if token:
            numerator, denominator = token[1].split('/')
            if int(denominator) == 0:
                raise ExprParseError("zero denominator", self.sentence, token[2])
            return DiffPolynomial.constant(Fraction(int(numerator), int(denominator)))
        token = self._accept('INTEGER')
        if token:
            return DiffPolynomial.constant(int(token[1]))
        token = self._accept('IDENT')
        if token:
            return self._identifier(token[1], token[2])
        if self._accept('LEFT_PAREN'):
            inner = self._expr()
            self._expect('RIGHT_PAREN', "')'")
            return inner
        _, lexeme, position = self.tokens[self.pos]
        found = repr(lexeme) if lexeme else "end of input"
        raise ExprParseError(f"expected an operand, found {found}", self.sentence, position)

    def _identifier(self, name: str, position: int) -> DiffPolynomial:
        if name in ('t', 'x'):
            return DiffPolynomial.var(name)
        if name in ('a', 'b'):
            return DiffPolynomial.param(name)
        match = re.fullmatch(r'y([1-9][0-9]*)', name)
        if match:
            self._check_y(int(match.group(1)), position)
            return DiffPolynomial.var(name)
        match = re.fullmatch(r'f([0-9]+)', name)
        if match:
            return DiffPolynomial.fsym(int(match.group(1)))
        head, _, suffix = name.partition('_')
        if head == 'u' or head in FUNCTION_DEPENDENCIES:
            if _ and not suffix:
                raise ExprParseError(f"empty derivative suffix in {name!r}", self.sentence, position)
            try:
                index = index_from_suffix(suffix)
            except JetDomainError as e:
                raise ExprParseError(str(e), self.sentence, position) from e
            self._check_y(index.max_y, position)
            if head == 'u':
                return DiffPolynomial.jet(index)
            return DiffPolynomial.function(head, index)
        raise ExprParseError(f"unknown identifier {name!r}", self.sentence, position)

    def _check_y(self, j: int, position: int):
        if j > self.n:
            raise ExprParseError(f"y-index {j} out of range for n={self.n}", self.sentence, position)


def parse(text: str, n: int) -> DiffPolynomial:
    return Parser(n).parse(text)


def parse_x_polynomial(text: str) -> DiffPolynomial:
    """Parse a rational polynomial in x alone (n1-family inputs)."""
    poly = parse(text, 1)
    for (pa, pb, base, fsym, jet, funcs), _ in poly.items():
        if pa or pb or fsym or jet or funcs or len(base) > 2 or (base and base[0]):
            raise ExprParseError(f"expected a polynomial in x only, got {text!r}", text, 0)
    return poly
