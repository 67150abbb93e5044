"""
String rewriting for finitely presented monoids.

Words are Python strings over an arbitrary alphabet of single characters.
Completion follows the usual Knuth-Bendix loop with the shortlex order:
inter-reduce the rules, add the unresolved critical pairs, repeat. It gives
up, rather than looping, once any of the caps is hit; the partial rule set
is still sound (every rule is a consequence of the presentation), only no
longer known to be confluent.
"""
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

Rule = Tuple[str, str]

MAX_RULES = 10000
MAX_RULE_LENGTH = 40
ITERATION_LIMIT = 20


def shortlex_ordered(a: str, b: str) -> Rule:
    """The pair as (larger, smaller) in shortlex order."""
    if (len(a), a) > (len(b), b):
        return (a, b)
    return (b, a)


def reduced(word: str, rules: Sequence[Rule]) -> str:
    # rules are shortlex-decreasing, so this terminates
    while True:
        before = word
        for left, right in rules:
            word = word.replace(left, right)
        if word == before:
            return word


@dataclass
class RewritingSystem:
    rules: List[Rule] = field(default_factory=list)
    confluent: bool = False
    reason: str = ""

    def normal_form(self, word: str) -> str:
        return reduced(word, self.rules)

    def __len__(self) -> int:
        return len(self.rules)


def complete(relations: Iterable[Rule], max_rules: int = MAX_RULES,
             max_length: int = MAX_RULE_LENGTH,
             iteration_limit: int = ITERATION_LIMIT) -> RewritingSystem:
    """Knuth-Bendix completion of the given relations under the shortlex order."""
    relations = list(relations)
    rule_set: Set[Rule] = set()
    for left, right in relations:
        if left != right:
            rule_set.add(shortlex_ordered(left, right))
    rule_list = sorted(rule_set)
    settled = 0

    def replace_rule_at(index: int, first: str, second: str) -> None:
        nonlocal settled
        rule_set.discard(rule_list[index])
        del rule_list[index]
        if index < settled:
            settled -= 1
        new_rule = shortlex_ordered(first, second)
        if new_rule[0] != new_rule[1] and new_rule not in rule_set:
            rule_set.add(new_rule)
            rule_list.append(new_rule)

    for iteration in range(1, iteration_limit + 1):
        # inter-reduce: no left side occurs inside another rule
        while settled < len(rule_list):
            left1, right1 = rule_list[settled]
            for index, (left2, right2) in enumerate(rule_list[:settled + 1]):
                if left2 in right1:
                    replace_rule_at(settled, right1.replace(left2, right2), left1)
                    break
                if left1 in right2:
                    replace_rule_at(index, right2.replace(left1, right1), left2)
                    break
                if index == settled:
                    continue
                if left2 in left1:
                    replace_rule_at(settled, left1.replace(left2, right2), right1)
                    break
                if left1 in left2:
                    replace_rule_at(index, left2.replace(left1, right1), right2)
                    break
            else:
                settled += 1

        # overlaps of a suffix of one left side with a prefix of another
        prefixes: Dict[str, List[Rule]] = defaultdict(list)
        suffixes: Dict[str, List[Rule]] = defaultdict(list)
        for rule in rule_list:
            left = rule[0]
            for cut in range(1, len(left)):
                prefixes[left[:cut]].append(rule)
                suffixes[left[cut:]].append(rule)
        critical = []
        for overlap in prefixes.keys() & suffixes.keys():
            for left1, right1 in prefixes[overlap]:
                tail = left1[len(overlap):]
                for left2, right2 in suffixes[overlap]:
                    head = left2[:-len(overlap)]
                    one = reduced(right2 + tail, rule_list)
                    two = reduced(head + right1, rule_list)
                    if one != two:
                        critical.append(shortlex_ordered(one, two))

        if not critical:
            logger.info(f"Completion finished after {iteration} rounds with {len(rule_list)} rules")
            return RewritingSystem(list(rule_list), confluent=True)
        for pair in critical:
            if pair not in rule_set:
                rule_set.add(pair)
                rule_list.append(pair)
        longest = max(len(left) for left, _ in rule_list)
        if len(rule_list) > max_rules or longest > max_length:
            reason = f"caps reached: {len(rule_list)} rules, longest left side {longest}"
            logger.warning(f"Completion abandoned, {reason}")
            return RewritingSystem(_sound_rules(rule_list), confluent=False, reason=reason)

    reason = f"no confluence after {iteration_limit} rounds"
    logger.warning(f"Completion abandoned, {reason}")
    return RewritingSystem(_sound_rules(rule_list), confluent=False, reason=reason)


def _sound_rules(rule_list: List[Rule]) -> List[Rule]:
    return [rule for rule in rule_list if rule[0] != rule[1]]


def bounded_search(source: str, target: str, relations: Sequence[Rule],
                   extra_length: int = 2, node_limit: int = 20000) -> Optional[bool]:
    """Look for a chain of relation applications joining two words.

    Searches from both ends at once, inside words at most ``extra_length``
    letters longer than the longer input. True when a chain is found, None
    when the search space or the node budget runs out without one.
    """
    if source == target:
        return True
    moves: List[Rule] = []
    for left, right in relations:
        moves.append((left, right))
        moves.append((right, left))
    ceiling = max(len(source), len(target)) + extra_length
    frontiers = [deque([source]), deque([target])]
    seen = [{source}, {target}]
    explored = 0
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        for _ in range(len(frontiers[side])):
            word = frontiers[side].popleft()
            for neighbour in _neighbours(word, moves, ceiling):
                if neighbour in seen[1 - side]:
                    return True
                if neighbour not in seen[side]:
                    seen[side].add(neighbour)
                    frontiers[side].append(neighbour)
                    explored += 1
                    if explored > node_limit:
                        return None
    return None


def _neighbours(word: str, moves: Sequence[Rule], ceiling: int) -> Iterable[str]:
    for left, right in moves:
        if len(word) - len(left) + len(right) > ceiling:
            continue
        if not left:
            for position in range(len(word) + 1):
                yield word[:position] + right + word[position:]
            continue
        start = word.find(left)
        while start != -1:
            yield word[:start] + right + word[start + len(left):]
            start = word.find(left, start + 1)
