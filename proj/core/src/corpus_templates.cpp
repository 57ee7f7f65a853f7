#include "fixlab/corpus.hpp"

namespace fixlab {

namespace {

ProgramTemplate make(const char* id, const char* markup,
                     std::vector<ProgramTemplate::RenamePool> pools,
                     std::vector<TemplateTestCase> tests) {
  return ProgramTemplate::parse(id, markup, std::move(pools), std::move(tests));
}

std::vector<ProgramTemplate> build_all() {
  std::vector<ProgramTemplate> out;

  out.push_back(make("sum_loop", R"tpl(#include <stdio.h>

int main(void) {
    int $n$;
    int $i$;
    int {{initialization#init-acc:$sum$ = 0}};
    scanf("%d", &$n$);
    for ($i$ = {{constant#start:1}}; $i$ {{loop-bound#bound:<= $n$}}; $i$++) {
        {{binary-operator#acc:$sum$ += $i$}};
    }
    printf({{io-format#show:"%d\n"}}, $sum$);
    return 0;
}
)tpl",
                     {{"n", {"n", "limit", "count"}},
                      {"i", {"i", "j", "k"}},
                      {"sum", {"sum", "total", "acc"}}},
                     {{"5\n", "15\n"}, {"3\n", "6\n"}}));

  out.push_back(make("max_array", R"tpl(#include <stdio.h>

int $find_max$(int $vals$[], int $count$) {
    int $best$ = $vals$[{{array-index#first:0}}];
    int $i$;
    for ($i$ = 1; $i$ {{loop-bound#scan:< $count$}}; $i$++) {
        if ($vals$[$i$] {{comparison#better:>}} $best$) {
            $best$ = $vals$[$i$];
        }
    }
    return {{return-expr#result:$best$}};
}

int main(void) {
    int $data$[8];
    int $count$;
    int $i$;
    scanf("%d", &$count$);
    for ($i$ = 0; $i$ < $count$; $i$++) {
        scanf("%d", &$data$[$i$]);
    }
    printf("%d\n", $find_max$($data$, $count$));
    return 0;
}
)tpl",
                     {{"find_max", {"find_max", "largest", "array_max"}},
                      {"vals", {"vals", "arr", "items"}},
                      {"count", {"count", "n", "size"}},
                      {"best", {"best", "max", "top"}},
                      {"i", {"i", "j", "idx"}},
                      {"data", {"data", "numbers", "buf"}}},
                     {{"4\n3 9 2 7\n", "9\n"}, {"3\n-5 -2 -9\n", "-2\n"}}));

  out.push_back(make("grade_switch", R"tpl(#include <stdio.h>

int main(void) {
    int $score$;
    char $grade$;
    scanf("%d", &$score$);
    $grade$ = 'F';
    switch ($score$ / 10) {
        {{switch-case#case-a:case 10:
        case 9:
            $grade$ = 'A';
            break;}}
        case 8:
            $grade$ = 'B';
            break;
        case 7:
            $grade$ = 'C';
            break;
        {{switch-case#case-d:case 6:
            $grade$ = 'D';
            break;}}
        default:
            break;
    }
    printf({{io-format#show:"%c\n"}}, $grade$);
    return 0;
}
)tpl",
                     {{"score", {"score", "points", "marks"}},
                      {"grade", {"grade", "letter", "result"}}},
                     {{"95\n", "A\n"}, {"61\n", "D\n"}}));

  out.push_back(make("count_evens", R"tpl(#include <stdio.h>

int main(void) {
    int $nums$[16];
    int $n$;
    int $i$;
    int {{initialization#init-count:$count$ = 0}};
    scanf("%d", &$n$);
    for ($i$ = 0; $i$ {{loop-bound#pass:< $n$}}; $i$++) {
        scanf("%d", &$nums$[$i$]);
    }
    for ($i$ = 0; $i$ < $n$; $i$++) {
        if ($nums$[$i$] {{binary-operator#mod:%}} 2 {{comparison#is-even:==}} {{constant#target:0}}) {
            $count$++;
        }
    }
    printf("%d\n", $count$);
    return 0;
}
)tpl",
                     {{"nums", {"nums", "values", "input"}},
                      {"n", {"n", "count_in", "len"}},
                      {"i", {"i", "j", "pos"}},
                      {"count", {"count", "evens", "hits"}}},
                     {{"5\n1 2 3 4 6\n", "3\n"}, {"4\n1 3 5 7\n", "0\n"}}));

  out.push_back(make("fib_iter", R"tpl(#include <stdio.h>

int $fib$(int $n$) {
    int $a$ = {{constant#base:0}};
    int {{initialization#init-b:$b$ = 1}};
    int $i$;
    int $t$;
    for ($i$ = 0; $i$ {{loop-bound#steps:< $n$}}; $i$++) {
        $t$ = {{binary-operator#step:$a$ + $b$}};
        $a$ = $b$;
        $b$ = $t$;
    }
    return {{return-expr#value:$a$}};
}

int main(void) {
    int $n$;
    scanf("%d", &$n$);
    printf("%d\n", $fib$($n$));
    return 0;
}
)tpl",
                     {{"fib", {"fib", "fibonacci", "fib_at"}},
                      {"n", {"n", "steps", "which"}},
                      {"a", {"a", "prev", "lo"}},
                      {"b", {"b", "cur", "hi"}},
                      {"i", {"i", "j", "k"}},
                      {"t", {"t", "tmp", "next"}}},
                     {{"7\n", "13\n"}, {"10\n", "55\n"}}));

  out.push_back(make("reverse_print", R"tpl(#include <stdio.h>

int main(void) {
    int $items$[10];
    int $n$;
    int $i$;
    scanf("%d", &$n$);
    for ($i$ = 0; $i$ < $n$; $i$++) {
        scanf("%d", &$items$[$i$]);
    }
    for ($i$ = $n$ - 1; $i$ {{comparison#stop:>=}} {{constant#floor:0}}; $i$--) {
        printf({{io-format#cell:"%d "}}, $items$[{{array-index#cell-at:$i$}}]);
    }
    printf("\n");
    return 0;
}
)tpl",
                     {{"items", {"items", "list", "vals"}},
                      {"n", {"n", "size", "total"}},
                      {"i", {"i", "j", "p"}}},
                     {{"4\n1 2 3 4\n", "4 3 2 1 \n"}, {"2\n7 9\n", "9 7 \n"}}));

  out.push_back(make("clamp", R"tpl(#include <stdio.h>

int $clamp$(int $value$, int $low$, int $high$) {
    if ($value$ {{comparison#below:<}} $low$) {
        return {{return-expr#at-low:$low$}};
    }
    if ($value$ {{comparison#above:>}} $high$) {
        return {{return-expr#at-high:$high$}};
    }
    return $value$;
}

int main(void) {
    int $v$;
    int $lo$;
    int $hi$;
    scanf("%d %d %d", &$v$, &$lo$, &$hi$);
    printf({{io-format#show:"%d\n"}}, $clamp$($v$, $lo$, $hi$));
    return 0;
}
)tpl",
                     {{"clamp", {"clamp", "bound", "restrict_to"}},
                      {"value", {"value", "x", "input"}},
                      {"low", {"low", "lower", "min_v"}},
                      {"high", {"high", "upper", "max_v"}},
                      {"v", {"v", "num", "given"}},
                      {"lo", {"lo", "a", "left"}},
                      {"hi", {"hi", "b", "right"}}},
                     {{"5 1 10\n", "5\n"}, {"12 1 10\n", "10\n"}}));

  out.push_back(make("checksum", R"tpl(#include <stdio.h>

int main(void) {
    int $digits$[12];
    int $n$;
    int $i$;
    int {{initialization#init-total:$total$ = 0}};
    scanf("%d", &$n$);
    for ($i$ = 0; $i$ {{loop-bound#walk:< $n$}}; $i$++) {
        scanf("%d", &$digits$[$i$]);
    }
    for ($i$ = 0; $i$ < $n$; $i$++) {
        $total$ = {{binary-operator#fold:$total$ + $digits$[$i$]}};
    }
    printf("%d\n", $total$ {{binary-operator#wrap:%}} {{constant#modulus:10}});
    return 0;
}
)tpl",
                     {{"digits", {"digits", "parts", "codes"}},
                      {"n", {"n", "len", "m"}},
                      {"i", {"i", "j", "at"}},
                      {"total", {"total", "sum", "check"}}},
                     {{"3\n4 5 6\n", "5\n"}, {"2\n9 9\n", "8\n"}}));

  out.push_back(make("vowel_switch", R"tpl(#include <stdio.h>

int main(void) {
    char $text$[64];
    int $i$;
    int {{initialization#init-hits:$hits$ = 0}};
    scanf("%s", $text$);
    for ($i$ = 0; $text$[$i$] != '\0'; $i$++) {
        switch ($text$[$i$]) {
            {{switch-case#vowel-a:case 'a':
                $hits$++;
                break;}}
            case 'e':
                $hits$++;
                break;
            {{switch-case#vowel-i:case 'i':
                $hits$++;
                break;}}
            case 'o':
            case 'u':
                $hits$++;
                break;
            default:
                break;
        }
    }
    printf({{io-format#show:"%d\n"}}, $hits$);
    return 0;
}
)tpl",
                     {{"text", {"text", "word", "line"}},
                      {"i", {"i", "j", "pos"}},
                      {"hits", {"hits", "vowels", "found"}}},
                     {{"banana\n", "3\n"}, {"xyz\n", "0\n"}}));

  out.push_back(make("temp_convert", R"tpl(#include <stdio.h>

int main(void) {
    int $celsius$;
    scanf("%d", &$celsius$);
    int $fahrenheit$ = $celsius$ {{binary-operator#scale:*}} 9 / 5 + {{constant#offset:32}};
    if ($fahrenheit$ {{comparison#hot:>=}} {{constant#limit:100}}) {
        printf({{io-format#warn:"hot\n"}});
    }
    printf({{io-format#reading:"%d\n"}}, $fahrenheit$);
    return 0;
}
)tpl",
                     {{"celsius", {"celsius", "c", "temp_c"}},
                      {"fahrenheit", {"fahrenheit", "f", "temp_f"}}},
                     {{"20\n", "68\n"}, {"45\n", "hot\n113\n"}}));

  out.push_back(make("digit_count", R"tpl(#include <stdio.h>

int $count_digits$(int $value$) {
    int {{initialization#init-width:$width$ = 1}};
    while ($value$ {{loop-bound#more:>= 10}}) {
        $value$ = {{binary-operator#shrink:$value$ / 10}};
        $width$++;
    }
    return {{return-expr#width:$width$}};
}

int main(void) {
    int $v$;
    scanf("%d", &$v$);
    printf("%d\n", $count_digits$($v$));
    return 0;
}
)tpl",
                     {{"count_digits", {"count_digits", "num_digits", "width_of"}},
                      {"value", {"value", "x", "rest"}},
                      {"width", {"width", "digits", "count"}},
                      {"v", {"v", "n", "input"}}},
                     {{"7\n", "1\n"}, {"4821\n", "4\n"}}));

  out.push_back(make("array_shift", R"tpl(#include <stdio.h>

int main(void) {
    int $src$[10];
    int $dst$[10];
    int $n$;
    int $i$;
    scanf("%d", &$n$);
    for ($i$ = 0; $i$ < $n$; $i$++) {
        scanf("%d", &$src$[$i$]);
    }
    for ($i$ = 0; $i$ {{loop-bound#copy:< $n$}}; $i$++) {
        $dst$[{{array-index#to:$i$}}] = $src$[{{array-index#from:$n$ - 1 - $i$}}];
    }
    for ($i$ = 0; $i$ < $n$; $i$++) {
        printf({{io-format#emit:"%d "}}, $dst$[$i$]);
    }
    printf("\n");
    return 0;
}
)tpl",
                     {{"src", {"src", "input", "orig"}},
                      {"dst", {"dst", "output", "flipped"}},
                      {"n", {"n", "count", "len"}},
                      {"i", {"i", "j", "k"}}},
                     {{"3\n1 2 3\n", "3 2 1 \n"}, {"5\n1 2 3 4 5\n", "5 4 3 2 1 \n"}}));

  return out;
}

} // namespace

const std::vector<ProgramTemplate>& builtin_templates() {
  static const std::vector<ProgramTemplate> templates = build_all();
  return templates;
}

} // namespace fixlab
