"""Generated by tools/gen_cheb_tables.py -- do not edit."""

TABLES = {
    4: (
        [(-1.5484005705394066+1.1918258539276156j), (-1.5484005705394066-1.1918258539276156j), (0.36783831439986897+3.6581332720632984j), (0.36783831439986897-3.6581332720632984j)],
        [(0.061683522554955926-1.9050594559798801j), (0.061683522554955926+1.9050594559798801j), (-0.07339241923416087+0.4500049158537898j), (-0.07339241923416087-0.4500049158537898j)],
    ),
    5: (
        [(-1.4405947739930434+2.396982778712456j), (-1.4405947739930434-2.396982778712456j), (1.0395069762764155+4.921388603222002j), (1.0395069762764155-4.921388603222002j), (-2.15541428943283+0j)],
        [(-1.87238281498337-0.3782067899419599j), (-1.87238281498337+0.3782067899419599j), (0.23878812038733033+0.10373892026622501j), (0.23878812038733033-0.10373892026622501j), (3.2718146221939954+0j)],
    ),
    6: (
        [(-2.400602938931979+1.1931293084021055j), (-2.400602938931979-1.1931293084021055j), (-1.1585525717180971+3.6147726008197254j), (-1.1585525717180971-3.6147726008197254j), (1.781988275922151+6.196512467347257j), (1.781988275922151-6.196512467347257j)],
        [(0.5790130040299186-4.286888564576615j), (0.5790130040299186+4.286888564576615j), (-0.6630068705273008+1.451412919900946j), (-0.6630068705273008-1.451412919900946j), (0.08358161715618094-0.10642926074778035j), (0.08358161715618094+0.10642926074778035j)],
    ),
    7: (
        [(-2.4231963194543926+2.3930292987749215j), (-2.4231963194543926-2.3930292987749215j), (-0.7576085974366754+4.843618480318245j), (-0.7576085974366754-4.843618480318245j), (2.575726131067255+7.48097736760744j), (2.575726131067255-7.48097736760744j), (-2.941096892585517+0j)],
        [(-4.456669211476398-1.5604498800678734j), (-4.456669211476398+1.5604498800678734j), (0.9026051607551444+0.7400361476574014j), (0.9026051607551444-0.7400361476574014j), (-0.0396804610540774-0.052477615822340715j), (-0.0396804610540774+0.052477615822340715j), (7.1876256810460735+0j)],
    ),
    8: (
        [(-3.220945245054342+1.1936196054193298j), (-3.220945245054342-1.1936196054193298j), (-2.2922491478210967+3.6007714960770945j), (-2.2922491478210967-3.6007714960770945j), (-0.26949098736741733+6.0820325927001075j), (-0.26949098736741733-6.0820325927001075j), (3.4085395014617514+8.773034564408121j), (3.4085395014617514-8.773034564408121j)],
        [(1.8317717106329852-9.525608129943688j), (1.8317717106329852+9.525608129943688j), (-2.436240732924994+3.7167556408605305j), (-2.436240732924994-3.7167556408605305j), (0.6325880537326959-0.44392310270013335j), (0.6325880537326959+0.44392310270013335j), (-0.028129757161816756+0.011577384568880397j), (-0.028129757161816756-0.011577384568880397j)],
    ),
    9: (
        [(-3.3196836132836367+2.3913415662386597j), (-3.3196836132836367-2.3913415662386597j), (-2.047795521100498+4.816232264480687j), (-2.047795521100498-4.816232264480687j), (0.28571636341792184+7.328757957476205j), (0.28571636341792184-7.328757957476205j), (4.272277344215858+10.071413403051519j), (4.272277344215858-10.071413403051519j), (-3.7264404402040907+0j)],
        [(-10.197195725320341-4.561767926094589j), (-10.197195725320341+4.561767926094589j), (2.4638881167480244+2.7896859402936296j), (2.4638881167480244-2.7896859402936296j), (-0.15496216545435829-0.44758717918324775j), (-0.15496216545435829+0.44758717918324775j), (0.0018222944116805587+0.013400277203163825j), (0.0018222944116805587-0.013400277203163825j), (15.772898187392832+0j)],
    ),
    10: (
        [(-4.027732483729833+1.193856067333312j), (-4.027732483729833-1.193856067333312j), (-3.283752900098784+3.5943867748122624j), (-3.283752900098784-3.5943867748122624j), (-1.7154060337875+6.038934929043291j), (-1.7154060337875-6.038934929043291j), (0.8944046821711605+8.582756902506212j), (0.8944046821711605-8.582756902506212j), (5.161191251645805+11.375156254838123j), (5.161191251645805-11.375156254838123j)],
        [(4.818382059007493-21.054597597144486j), (4.818382059007493+21.054597597144486j), (-7.1171652095015165+8.819533323104746j), (-7.1171652095015165-8.819533323104746j), (2.565584997126989-1.2163857358594095j), (2.565584997126989+1.2163857358594095j), (-0.27258698546157184+0.014211728318112522j), (-0.27258698546157184-0.014211728318112522j), (0.0057849039773289175+0.0006858507045248317j), (0.0057849039773289175-0.0006858507045248317j)],
    ),
    11: (
        [(-4.17650923610943+2.39046528233158j), (-4.17650923610943-2.39046528233158j), (-3.1429902059827133+4.8030732571702055j), (-3.1429902059827133-4.8030732571702055j), (-1.3125380102591573+7.268318858648197j), (-1.3125380102591573-7.268318858648197j), (1.5468804246273227+9.843173325869158j), (1.5468804246273227-9.843173325869158j), (6.071061114286377+12.683520496740694j), (6.071061114286377-12.683520496740694j), (-4.511622206045174+0j)],
        [(-22.940705706675526-11.849853679853695j), (-22.940705706675526+11.849853679853695j), (5.983566402352556+8.4644562939624j), (5.983566402352556-8.4644562939624j), (-0.3085128119236435-1.983375101764044j), (-0.3085128119236435+1.983375101764044j), (-0.034047271248644734+0.14565217899632377j), (-0.034047271248644734-0.14565217899632377j), (0.0008816721883547104-0.002280367896668436j), (0.0008816721883547104+0.002280367896668436j), (34.59763549710072+0j)],
    ),
    12: (
        [(-4.827494174587594+1.19398793770884j), (-4.827494174587594-1.19398793770884j), (-4.206124927739347+3.5909205906678743j), (-4.206124927739347-3.5909205906678743j), (-2.9178692532255934+6.017345628905562j), (-2.9178692532255934-6.017345628905562j), (-0.8517077580003192+8.503832410628911j), (-0.8517077580003192-8.503832410628911j), (2.2359676498896834+11.109295737043418j), (2.2359676498896834-11.109295737043418j), (6.998687356007682+13.995916098133241j), (6.998687356007682-13.995916098133241j)],
        [(11.799390212521539-46.411666208812605j), (11.799390212521539+46.411666208812605j), (-18.785993226850717+20.23729607432776j), (-18.785993226850717-20.23729607432776j), (8.23826225138069-2.796190995630047j), (8.23826225138069+2.796190995630047j), (-1.3194123250126404-0.18352420676318876j), (-1.3194123250126404+0.18352420676318876j), (0.06857151701068004+0.0384191387348848j), (0.06857151701068004-0.0384191387348848j), (-0.0008184336486258401-0.0005813543348347253j), (-0.0008184336486258401+0.0005813543348347253j)],
    ),
    13: (
        [(-5.011694352525365+2.3899528943400434j), (-5.011694352525365-2.3899528943400434j), (-4.139543242975485+4.795668914911319j), (-4.139543242975485-4.795668914911319j), (-2.623125239839606+7.236995047152959j), (-2.623125239839606-7.236995047152959j), (-0.34222482667457593+9.744970341927994j), (-0.34222482667457593-9.744970341927994j), (2.956196193767272+12.380534023440635j), (2.956196193767272-12.380534023440635j), (7.941586670444476+15.311871972347518j), (7.941586670444476-15.311871972347518j), (-5.296710721441856+0j)],
        [(-51.163443669455674-29.083220136097662j), (-51.163443669455674+29.083220136097662j), (13.766079251476722+23.10885862314783j), (13.766079251476722-23.10885862314783j), (-0.21559470199482492-6.788484286964347j), (-0.21559470199482492+6.788484286964347j), (-0.35143569600609664+0.7609919422486205j), (-0.35143569600609664-0.7609919422486205j), (0.028327643148307057-0.028043136520305663j), (0.028327643148307057+0.028043136520305663j), (-0.0003077036254037273+0.00026269453379112003j), (-0.0003077036254037273-0.00026269453379112003j), (75.8727497541617+0j)],
    ),
    14: (
        [(-5.623171534758011+1.1940664287007021j), (-5.623171534758011-1.1940664287007021j), (-5.0893745648738005+3.5888160956024366j), (-5.0893745648738005-3.5888160956024366j), (-3.99340042964899+6.004818060140396j), (-3.99340042964899-6.004818060140396j), (-2.269816525854417+8.461717806879609j), (-2.269816525854417-8.461717806879609j), (0.20872377764756553+10.991232026330678j), (0.20872377764756553-10.991232026330678j), (3.7032391601781884+13.656333463712347j), (3.7032391601781884-13.656333463712347j), (8.897735413180197+16.630935208424827j), (8.897735413180197-16.630935208424827j)],
        [(27.87616229112011-102.15000629300854j), (27.87616229112011+102.15000629300854j), (-46.93490458692084+45.64454383887639j), (-46.93490458692084-45.64454383887639j), (23.498979419093462-5.8082192082917015j), (23.498979419093462+5.8082192082917015j), (-4.807233308937505-1.321112203131724j), (-4.807233308937505+1.321112203131724j), (0.3763633673443194+0.33520468312265045j), (0.3763633673443194-0.33520468312265045j), (-0.009438720564639954-0.017185736312422026j), (-0.009438720564639954+0.017185736312422026j), (7.153878175387532e-05+0.00014361901813708973j), (7.153878175387532e-05-0.00014361901813708973j)],
    ),
}
