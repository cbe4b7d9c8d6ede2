"""The ten behavior-preserving mutation operators."""

DEAD_STORE = "DEAD_STORE"
OBFUSCATE_NUMERIC = "OBFUSCATE_NUMERIC"
DUPLICATE_ASSIGNMENT = "DUPLICATE_ASSIGNMENT"
UNREACHABLE_IF = "UNREACHABLE_IF"
UNREACHABLE_IF_ELSE = "UNREACHABLE_IF_ELSE"
UNREACHABLE_SWITCH = "UNREACHABLE_SWITCH"
UNREACHABLE_FOR = "UNREACHABLE_FOR"
UNREACHABLE_WHILE = "UNREACHABLE_WHILE"
RENAME_LOCAL = "RENAME_LOCAL"
FOR_WHILE_TO_DO_WHILE = "FOR_WHILE_TO_DO_WHILE"

ALL_OPERATORS = (
    DEAD_STORE,
    OBFUSCATE_NUMERIC,
    DUPLICATE_ASSIGNMENT,
    UNREACHABLE_IF,
    UNREACHABLE_IF_ELSE,
    UNREACHABLE_SWITCH,
    UNREACHABLE_FOR,
    UNREACHABLE_WHILE,
    RENAME_LOCAL,
    FOR_WHILE_TO_DO_WHILE,
)

DESCRIPTIONS = {
    DEAD_STORE: "insert a single unused variable declaration into one basic block",
    OBFUSCATE_NUMERIC: "rewrite one numeric value or variable v as v + c - c with the same constant c, "
                       "in an assignment, declaration, or return statement",
    DUPLICATE_ASSIGNMENT: "duplicate one assignment statement immediately after itself; "
                          "only assignments free of method invocations qualify",
    UNREACHABLE_IF: "insert an if statement guarded by an always-false runtime value",
    UNREACHABLE_IF_ELSE: "insert an if-else statement whose condition is an always-false runtime value "
                         "and whose executed else branch has no observable effect",
    UNREACHABLE_SWITCH: "insert a switch statement whose selector value makes every non-default case dead, "
                        "falling through to an empty default",
    UNREACHABLE_FOR: "insert a for loop whose condition is an always-false runtime value",
    UNREACHABLE_WHILE: "insert a while loop whose condition is an always-false runtime value",
    RENAME_LOCAL: "rename one local variable to a fresh single-letter name from [a-z]",
    FOR_WHILE_TO_DO_WHILE: "replace one for or while loop with an equivalent guarded do-while loop",
}

INSERTION_OPERATORS = frozenset({
    DEAD_STORE, UNREACHABLE_IF, UNREACHABLE_IF_ELSE,
    UNREACHABLE_SWITCH, UNREACHABLE_FOR, UNREACHABLE_WHILE,
})
